# SPDX-FileCopyrightText: 2024-present David C. Fox <talk2dfox@gmail.com>
#
# SPDX-License-Identifier: MIT
__version__ = "0.2.0"
