from .__version__ import __version__
from .core import *
from .excess import *
# after .excess: the excess() function shadows the submodule name
from .spectral import *
from .extension import *
from .lab import (
    GENERATORS, DEFAULT_SCHEDULE, get_generator, generate, cross_defects,
    essential_duality_diagnostic, extendability_diagnostic, parseval_completion_trend)
from .io import read_sequence, write_sequence, dumps
