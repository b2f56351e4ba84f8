#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# ifreq documentation build configuration file.
import os
import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))
from ifreq import __version__ as release


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.intersphinx']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'ifreq'
copyright = '2024, the ifreq developers'
author = 'the ifreq developers'

# The short X.Y version.
version = '.'.join(release.split('.')[:2])

language = 'en'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'sphinx'

todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'

html_static_path = []

htmlhelp_basename = 'ifreqdoc'


# -- Options for LaTeX / manual page / Texinfo output ---------------------

latex_documents = [
    (master_doc, 'ifreq.tex', 'ifreq Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'ifreq', 'ifreq Documentation', [author], 1)
]

texinfo_documents = [
    (master_doc, 'ifreq', 'ifreq Documentation', author, 'ifreq',
     'Instantaneous complex frequency of three-phase signals.',
     'Miscellaneous'),
]

intersphinx_mapping = {'numpy': ('https://numpy.org/doc/stable/', None)}
