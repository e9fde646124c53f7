"""CLI entrypoint"""
import sys

from hcx.cli import main

if __name__ == "__main__":
    sys.exit(main())
