"""Linking numbers, rotation data and generalized actions of surface isotopies."""
from . import action, cover, diskchain, isotopy, linking, measures, recurrence, zoo
from .action import (action_difference, action_differences, action_on_contractible,
                     action_on_fixlift, classical_action, classical_delta, spectrum, swept_area)
from .cover import ANNULUS, PLANE, TORUS, SampledPath, intersection_number, winding_number
from .diskchain import (FreeDisk, chain_width_algebra, find_periodic_chain, is_free,
                        locate_fixed_point, rot_hull, verify_chain_bound)
from .errors import SurflinkError
from .isotopy import (HamiltonianIsotopy, IdentityIsotopy, VectorFieldIsotopy, compose, inverse,
                      iterate, lift, mobius_normalize)
from .linking import (deck_summed_linking, planar_linking, pointwise_linking,
                      triple_linking_fixed, triple_linking_recurrent, two_puncture_rotation,
                      wb_diagnostic)
from .measures import AtomicMeasure, GridDensity, RadialClosedForm
from .recurrence import (Disk, first_return, kac_check, rotation_number_annulus,
                         rotation_vector_measure, rotation_vector_torus)
from .zoo import ZOO_NAMES, zoo

__version__ = "0.1.0"
