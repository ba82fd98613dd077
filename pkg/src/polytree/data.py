"""Sample container shared by every estimator in the package."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SampleMatrix:
    """An n-by-p matrix of i.i.d. observations, one variable per column.

    Entries must be finite reals; missing values are rejected outright
    because every estimator here is rank-based and silent imputation would
    corrupt the ranks.  ``names`` optionally labels the columns (used by the
    CSV/DOT front end); vertices are addressed 0-based everywhere else.
    """

    values: np.ndarray
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"sample must be a 2-D array, got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"sample must be non-empty, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("sample contains non-finite values (NaN or inf)")
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != arr.shape[1]:
                raise ValueError(
                    f"got {len(names)} column names for {arr.shape[1]} columns"
                )
            object.__setattr__(self, "names", names)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        """Number of observations (rows)."""
        return self.values.shape[0]

    @property
    def p(self) -> int:
        """Number of variables (columns)."""
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Read-only view of column j."""
        return self.values[:, j]

    def name_of(self, j: int) -> str:
        if self.names is not None:
            return self.names[j]
        return f"X{j + 1}"

    def require_min_rows(self, n_min: int = 2) -> None:
        if self.n < n_min:
            raise ValueError(f"need at least {n_min} observations, got {self.n}")
