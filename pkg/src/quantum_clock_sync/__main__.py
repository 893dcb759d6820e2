# -*- coding: utf-8 -*-

"""Quantum Clock Sync Main."""

from .cli import main

if __name__ == '__main__':
    main()
