# Configuration file for the Sphinx documentation builder.
import os
import sys
sys.path.insert(0, os.path.abspath('..'))

import hermgenus  # NOQA


# -- Project information -----------------------------------------------------

project = 'hermgenus'
copyright = '2024, The hermgenus developers'
author = 'The hermgenus developers'

version = hermgenus.__version__
release = hermgenus.__version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_static_path = ['_static']
htmlhelp_basename = 'hermgenusdoc'


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'herm-genus', 'hermgenus Documentation',
     [author], 1)
]

todo_include_todos = True
