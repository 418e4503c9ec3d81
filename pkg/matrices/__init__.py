from .base import GenericMatrix, MatrixBackend
from .genmat import MatrixContext, make_context
from .numcheck import SamplePoint

BACKEND_MAP = {
    'symbolic': MatrixContext,
    'numeric': SamplePoint,
}


def get_backend(name: str, d: int, **kwargs) -> MatrixBackend:
    """Instantiate a registered backend by name."""
    if name not in BACKEND_MAP:
        raise ValueError(f"unknown backend {name!r}, expected one of {sorted(BACKEND_MAP)}")
    return BACKEND_MAP[name](d, **kwargs)
