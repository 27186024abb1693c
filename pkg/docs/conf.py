"""Sphinx configuration."""
from datetime import datetime


project = "sumcentral"
author = "Yvan Nollet"
copyright = f"{datetime.now().year}, {author}"
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx_click",
]
autodoc_typehints = "description"
html_theme = "furo"
intersphinx_mapping = {
    "networkx": ("https://networkx.org/documentation/stable/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "xarray": ("https://docs.xarray.dev/en/stable/", None),
}

napoleon_preprocess_types = True
napoleon_type_aliases = {
    "array": "~numpy.ndarray",
    "array-like": ":term:`array-like <numpy:array_like>`",
    "DataArray": "~xarray.DataArray",
    "DataFrame": "~pandas.DataFrame",
    "Dataset": "~xarray.Dataset",
    "path-like": ":term:`path-like <python:path-like object>`",
}
