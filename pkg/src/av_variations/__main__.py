# SPDX-FileCopyrightText: 2024-present David C. Fox <talk2dfox@gmail.com>
#
# SPDX-License-Identifier: MIT
import sys

from .cli import main

sys.exit(main())
