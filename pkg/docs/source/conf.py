# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys, pathlib

sys.path.insert(0, pathlib.Path(__file__).parents[2].resolve().as_posix())

# -- Project information -----------------------------------------------------

project = 'veechenum'
copyright = '2022, BlackThunder'
author = 'BlackThunder'

release = '0.1.0'
source_suffix = '.rst'

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.napoleon',
]

templates_path = ['_templates']
exclude_patterns = []

intersphinx_mapping = {'python': ('https://docs.python.org/3', None)}

# -- Options for HTML output -------------------------------------------------

html_theme = 'basic'
html_static_path = []
pygments_style = 'friendly'

autodoc_member_order = 'bysource'
autodoc_typehints = 'none'
