"""python -m hcx"""
import sys

from .cli import main

sys.exit(main())
