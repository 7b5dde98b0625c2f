import sys

# Entry point when running from a checkout: python main.py <command> ...
from rrsynth.cli import main

if __name__ == "__main__":
    sys.exit(main())
