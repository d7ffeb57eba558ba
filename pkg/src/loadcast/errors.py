"""Error taxonomy shared by the library and the command line front end."""


class LoadcastError(Exception):
    """Base class for expected failures."""


class ConfigError(LoadcastError):
    """The run was configured incorrectly (unknown model, bad key, bad mode)."""


class DataError(LoadcastError):
    """The supplied data cannot support the requested run."""
