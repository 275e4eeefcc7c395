"""Sparse pancyclic subgraphs of random and complete hosts.

Builds, for an n-vertex host, a pancyclic subgraph consisting of a
Hamilton cycle plus O(log n) chords, together with a certificate that
decodes an explicit cycle of every length in [3, n].
"""
from .bondy import BondyCertificate, bondy_construction
from .bounds import PexResult, check_shi, pex_exact_tiny, pex_lower_bound, shi_cycle_bound
from .certificate import Certificate, VerifyReport, decode_cycle, resolve_case, verify
from .errors import PancycError
from .graph import Graph, cycle_spectrum_bruteforce, is_pancyclic_bruteforce
from .params import ParamSet, derive_params, validate_coverage
from .pathfinder import SearchBudget, find_exact_cycle, find_exact_path, hamilton_path_between
from .pipeline import PipelineResult, run_pipeline
from .sampler import LayerSample, layer_probs, sample_gnp, sample_layers
from .synth import synthesize

__version__ = "0.1.0"

__all__ = [
    "BondyCertificate",
    "Certificate",
    "Graph",
    "LayerSample",
    "ParamSet",
    "PancycError",
    "PexResult",
    "PipelineResult",
    "SearchBudget",
    "VerifyReport",
    "bondy_construction",
    "check_shi",
    "cycle_spectrum_bruteforce",
    "decode_cycle",
    "derive_params",
    "find_exact_cycle",
    "find_exact_path",
    "hamilton_path_between",
    "is_pancyclic_bruteforce",
    "layer_probs",
    "pex_exact_tiny",
    "pex_lower_bound",
    "resolve_case",
    "run_pipeline",
    "sample_gnp",
    "sample_layers",
    "shi_cycle_bound",
    "synthesize",
    "validate_coverage",
    "verify",
    "__version__",
]
