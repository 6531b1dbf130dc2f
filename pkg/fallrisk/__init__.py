# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import fallrisk.cohort
import fallrisk.evaluate
import fallrisk.featurize
import fallrisk.plot
import fallrisk.scoring
import fallrisk.simulations
import fallrisk.solver
import fallrisk.utils
from fallrisk.types import *
from fallrisk.version import __version

__version__ = __version()
