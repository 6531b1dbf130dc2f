# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .utils import PathType, atomic_write, config_hash, dumps, to_jsonable

__all__ = [
    "PathType",
    "atomic_write",
    "config_hash",
    "dumps",
    "to_jsonable",
]
