"""Products of one-parameter persistence modules and hook decompositions."""
from .bipersistence import axis_barcodes, grid_module_of_pair
from .complex_io import FilteredComplex, parse_complex, read_complex, render_complex, sublevel
from .distances import (SearchConfig, SearchReport, bottleneck, gamma_bar_search, interleaving_exact,
                        matching_distance_estimate)
from .gamma_product import (GammaProduct, Matching, build_product, hooks_of_product,
                            reconstruct_from_hooks)
from .grid_modules import (GridModule, HookModule, evaluate_hooks, hook, hook_decompose,
                           iso_hook_decomposable)
from .linalg_fp import BACKEND, FpMatrix, rank, reduce
from .persistence1 import (BarcodePresentation, DiagramPoint, PersistenceDiagram, compute_diagram,
                           presentation_from_diagram, s_gamma)

__version__ = "0.1.0"
