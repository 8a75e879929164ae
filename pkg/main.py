#!/usr/bin/env python3
"""
slopeunit-lgcp - LGCP landslide intensity models on pixels and slope units

    python main.py simulate --config configs/demo.cfg
    python main.py fit --config configs/demo.cfg
    python main.py predict --config configs/demo.cfg
"""

import sys

from cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
