# Sphinx configuration for ds-tariff-equity-py-lib.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys
from importlib.metadata import PackageNotFoundError, version as pkg_version

sys.path.insert(0, os.path.abspath("../../src"))

# -- Project information -----------------------------------------------------

project = "ds-tariff-equity-py-lib"
copyright = "2026, Aider AS"
author = "Kristoffer Varslott"

try:
    version = pkg_version(project)
except PackageNotFoundError:
    import tomllib

    with open("../../pyproject.toml", "rb") as f:
        version = tomllib.load(f)["project"]["version"]
release = version

# -- Extensions --------------------------------------------------------------

extensions = [
    "autoapi.extension",
    "sphinx.ext.githubpages",
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
]

# API pages for the market, equilibrium, verification, tariff and stochastic
# packages; the CLI module is documented through its click help instead.
autoapi_dirs = ["../../src/ds_tariff_equity_py_lib"]
autoapi_ignore = ["*/cli.py"]
autoapi_options = ["members", "undoc-members", "show-inheritance", "show-module-summary"]
autoapi_member_order = "groupwise"

napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_attr_annotations = True

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "scipy": ("https://docs.scipy.org/doc/scipy", None),
    "pandas": ("https://pandas.pydata.org/docs", None),
}

# -- General configuration ---------------------------------------------------

templates_path = ["_templates"]
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

# -- HTML output ---------------------------------------------------------------

html_theme = "sphinx_material"
html_static_path = ["_static"]
html_title = "ds-tariff-equity-py-lib"
html_theme_options = {
    "nav_title": "Tariff equity",
    "repo_url": "https://github.com/grasp-labs/ds-tariff-equity-py-lib",
    "repo_name": "ds-tariff-equity-py-lib",
    "globaltoc_depth": 2,
}
