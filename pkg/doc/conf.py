#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# narayana-repdigits documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'recommonmark'
]

templates_path = ['templates']

source_suffix = ['.rst', '.md']

master_doc = 'index'

project = 'narayana-repdigits'
copyright = '2026, narayana-repdigits developers'
author = 'narayana-repdigits developers'

try:
    from narayana_repdigits import __version__ as release
except ImportError:
    release = 'unknown'
version = '.'.join(release.split('.')[:2])

language = 'en'

exclude_patterns = ['_build']

pygments_style = 'sphinx'

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'

htmlhelp_basename = 'narayana-repdigitsdoc'

autodoc_member_order = 'bysource'
