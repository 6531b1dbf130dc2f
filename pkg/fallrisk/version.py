# This version placeholder will be replaced during package build.
# Do not commit this file.
__version__ ="0.1.0"#
#
def __version() -> str:
    return __version__
