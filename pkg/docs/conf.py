# Sphinx configuration for the fallrisk documentation.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import fallrisk  # noqa: E402

project = "fallrisk"
copyright = "2026, The fallrisk developers"
version = release = fallrisk.__version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.mathjax",
    "sphinx.ext.intersphinx",
    "numpydoc",
]

# reference pages list functions by hand; numpydoc would repeat class members
numpydoc_show_class_members = False
autodoc_typehints = "description"

intersphinx_mapping = {
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/pandas-docs/stable", None),
    "python": ("https://docs.python.org/3.9", None),
    "sklearn": ("https://scikit-learn.org/stable", None),
}

master_doc = "index"
exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
html_theme_options = {"navigation_depth": 3, "collapse_navigation": False}
