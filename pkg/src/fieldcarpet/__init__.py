"""Self-similar carpets of the recurrence a(i,j) = a(i-1,j) + m a(i-1,j-1) + a(i,j-1) over finite fields."""

from .carpet import (
    CarpetIndex,
    CarpetMatrix,
    CarpetParams,
    FieldMatrix,
    SupportMatrix,
    closed_form_f,
    entry_at,
    fundamental_block,
    generate_recurrence,
    stream_rows,
    support,
    tensor_construction,
)
from .errors import CapacityError, CarpetError, ConsistencyError, DomainError, UsageError
from .finite_field import FieldElement, FieldSpec

__all__ = [
    "CapacityError", "CarpetError", "CarpetIndex", "CarpetMatrix", "CarpetParams",
    "ConsistencyError", "DomainError", "FieldElement", "FieldMatrix", "FieldSpec",
    "SupportMatrix", "UsageError", "closed_form_f", "entry_at", "fundamental_block",
    "generate_recurrence", "stream_rows", "support", "tensor_construction",
]
