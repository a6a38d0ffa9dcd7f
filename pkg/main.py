#!/usr/bin/env python3
"""
Intersection Homology Engine - Command Line Entry Point
"""

import sys

from modules.cli import main

if __name__ == '__main__':
    sys.exit(main())
