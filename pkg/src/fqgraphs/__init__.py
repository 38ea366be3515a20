"""Finite Euclidean graphs over GF(q)^d: spectra, pseudo-randomness checks,
and exact colored-subgraph counts."""

from .embeddings import (
    ColoredPattern,
    EmbeddingCount,
    aut_c,
    count_embeddings,
    naive_count_oracle,
    prediction_report,
)
from .finite_field import Field, FieldElement, add_char, make_field, trace
from .pseudorandomness import certify_rc, count_bipartite_edges, kaleido_conditions, mixing_check
from .quadratic_space import QuadraticForm, QuadraticSpace, VectorSpace, evaluate, pair_count, sphere
from .spectrum import (
    ColoredCayleyGraph,
    FDistanceSpec,
    SpectrumReport,
    dense_spectrum_oracle,
    eigenvalue,
    f_distance_spectrum,
    full_spectrum,
)

__version__ = "0.1.0"
