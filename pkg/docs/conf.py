# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# For a full list of options see the documentation:
# http://www.sphinx-doc.org/en/stable/config

# -- Path setup --------------------------------------------------------------

# Incase the project was not installed
import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import zetalab


# -- Project information -----------------------------------------------------

project = "zetalab"
copyright = (
    "2026, the zetalab developers. Project structure based on the "
    "Computational Molecular Science Python Cookiecutter version 1.6"
)
author = "the zetalab developers"

# The short X.Y version
version = zetalab.__version__
# The full version, including alpha/beta/rc tags
release = zetalab.__version__


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autosummary",
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.extlinks",
]

autosummary_generate = True
napoleon_google_docstring = False
napoleon_use_param = False
napoleon_use_ivar = True

intersphinx_mapping = {
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "mpmath": ("https://mpmath.org/doc/current/", None),
}

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = None
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "default"


# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
htmlhelp_basename = "zetalabdoc"


# -- Options for LaTeX output ------------------------------------------------

latex_elements = {}
latex_documents = [
    (master_doc, "zetalab.tex", "zetalab Documentation", "zetalab", "manual"),
]


# -- Options for manual page output ------------------------------------------

man_pages = [(master_doc, "zetalab", "zetalab Documentation", [author], 1)]


# -- Options for Texinfo output ----------------------------------------------

texinfo_documents = [
    (master_doc, "zetalab", "zetalab Documentation", author, "zetalab",
     "Fractal strings, zeta and the spectral operator.", "Miscellaneous"),
]
