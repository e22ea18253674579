"""Matrix Market interchange for dense matrices."""
import io
from pathlib import Path

import numpy as np
import scipy.io

from .linalg import as_matrix


def write_matrix_market(path, A, comment=""):
    """Write ``A`` in Matrix Market ``array real general`` format.

    Values are written with 17 significant digits so a read round-trips
    exactly.
    """
    A = as_matrix(A)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    scipy.io.mmwrite(str(path), A, comment=comment, field="real", precision=17, symmetry="general")
    return path


def read_matrix_market(source):
    """Read a Matrix Market file (array or coordinate) into a dense array.

    ``source`` may be a path or the file contents as a string.
    """
    if isinstance(source, str) and source.lstrip().startswith("%%MatrixMarket"):
        source = io.StringIO(source)
    elif isinstance(source, (str, Path)):
        source = str(source)
    M = scipy.io.mmread(source)
    if hasattr(M, "toarray"):
        M = M.toarray()
    return as_matrix(np.asarray(M, dtype=np.float64))
