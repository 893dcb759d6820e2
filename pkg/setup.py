# -*- coding: utf-8 -*-

"""Setup.py for quantum-clock-sync."""

import setuptools

if __name__ == '__main__':
    setuptools.setup()
