# SPDX-FileCopyrightText: 2024-present David C. Fox <talk2dfox@gmail.com>
#
# SPDX-License-Identifier: MIT
"""
tests for av_variations
"""
