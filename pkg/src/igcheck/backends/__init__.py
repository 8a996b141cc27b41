"""Table backends.

Evaluation works over dense boolean tables indexed by node tuples.  Two
interchangeable backends provide the table algebra:

  packed   bit-packed words driven by a compiled kernel (built from
           _packedcore.pyx when a C toolchain is present)
  dense    numpy boolean arrays, always available

get_backend picks packed when it imported cleanly, else dense.  The
IGCHECK_BACKEND environment variable or an explicit name overrides the
choice.  Backends are stateless apart from the node count, so instances
may be shared across threads.
"""

from __future__ import annotations

import os

from ..errors import InvalidArgumentError, ResourceError
from .dense import DenseBackend

try:
    from .packed import PackedBackend
    _PACKED_IMPORT_ERROR = None
except ImportError as exc:  # pragma: no cover - depends on build toolchain
    PackedBackend = None
    _PACKED_IMPORT_ERROR = exc

_CHOICES = ("auto", "packed", "dense")


def available_backends():
    """Backend names usable in this installation, preferred first."""
    if PackedBackend is not None:
        return ("packed", "dense")
    return ("dense",)


def get_backend(n_nodes, name=None):
    """Backend instance for a graph with n_nodes nodes.

    name may be 'auto', 'packed' or 'dense'; None reads IGCHECK_BACKEND
    and falls back to 'auto'.  Empty graphs always use the dense backend,
    whose degenerate shapes numpy already handles.
    """
    if n_nodes < 0:
        raise InvalidArgumentError("node count must be nonnegative")
    choice = name or os.environ.get("IGCHECK_BACKEND", "").strip() or "auto"
    if choice not in _CHOICES:
        raise InvalidArgumentError(
            f"unknown backend {choice!r}, expected one of {_CHOICES}")
    if choice == "packed":
        if PackedBackend is None:
            raise ResourceError(
                f"packed backend requested but the compiled kernel is "
                f"unavailable ({_PACKED_IMPORT_ERROR})")
        if n_nodes == 0:
            return DenseBackend(0)
        return PackedBackend(n_nodes)
    if choice == "dense":
        return DenseBackend(n_nodes)
    if PackedBackend is not None and n_nodes > 0:
        return PackedBackend(n_nodes)
    return DenseBackend(n_nodes)
