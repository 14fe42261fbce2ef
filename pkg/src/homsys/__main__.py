"""Run the command line with ``python -m homsys``."""

from .cli import main

main()
