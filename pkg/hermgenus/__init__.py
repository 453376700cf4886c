import logging

from .field import make_field  # NOQA
from .lattice import HermLattice, free_lattice, make_space  # NOQA
from .genus import genus_group, neighbour, special_genera  # NOQA


__version__ = "0.1.0"


logging.getLogger(__name__).addHandler(logging.NullHandler())
