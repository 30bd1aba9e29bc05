"""Linear graph-directed iterated function systems and their space-filling curves."""

from .catalogue import CatalogueEntry
from .chain import (ChainReport, HeadTailTable, ProbeReport, chain_check, cylinder_map,
                    diameter_bound, hata_condition, heads_tails, linearity_probe)
from .errors import (AmbiguityError, EnumerationCapError, GifsError, InvalidPathError,
                     InvalidSystemError, ParseError, PrecisionError)
from .lattice import (MarkedLatticePath, assess_marking, build_gifs, build_ifs, mark_enumerate,
                      overlap_probe, reptile_flag, search_paths)
from .parametrize import Parametrization, RecordingSystem, build_recording, encode, project
from .render import InitialPattern, approximate, default_pattern, point_pattern, to_svg
from .similitude import Similitude, apply, compose, compose_all, fixed_point
from .spectral import (SpectralData, barycenters, build_matrix, markov_weights, perron_vector,
                       solve_dimension, spectral_data, spectral_radius)
from .system import CylinderTable, Edge, OrderedGifs, PathWord, enumerate_cylinders
from .textio import format_gifs, format_path, parse_gifs, parse_path, parse_pattern

__version__ = "0.1.0"
