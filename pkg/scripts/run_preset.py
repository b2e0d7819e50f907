#!/usr/bin/env python3
"""Thin wrapper: run one figure preset from the repo checkout.

Example:
    python scripts/run_preset.py fig2 --out out/fig2 --workers 2
"""
import sys

from mwis_anneal.cli import main

if __name__ == "__main__":
    sys.exit(main(["preset", *sys.argv[1:]]))
