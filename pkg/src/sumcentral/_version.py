from importlib import metadata

_version = metadata.version("sumcentral")
