import csv
import io

import numpy as np
import pytest

from ve_infer import DomainError
from ve_infer.validation import MomentCheckRow, check_point, default_grid, rows_to_csv, validate_moment_grid


def test_default_grid_shape():
    grid = default_grid()
    assert len(grid) == 50
    x = np.array([lam * d for lam, d in grid])
    assert x[0] == pytest.approx(1e-4) and x[-1] == pytest.approx(50.0)
    assert np.allclose(np.diff(np.log(x)), np.log(x[1] / x[0]))


def test_lambda_d_10_row_flags_paper_mode():
    row = check_point(10.0, 1.0, replicates=200_000, seed=1)
    assert row.mean_pass and row.corrected_pass
    assert not row.paper_pass
    assert row.mean_rel_err < 1e-12


def test_empty_grid_rejected():
    with pytest.raises(DomainError):
        validate_moment_grid([])


def test_csv_round_trip():
    rows = validate_moment_grid([(2.0, 0.29), (0.01, 1.0)], replicates=20_000, seed=3)
    parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    assert list(parsed[0]) == list(MomentCheckRow.__dataclass_fields__)
    assert float(parsed[0]["lam"]) == 2.0
    assert float(parsed[0]["var_corrected"]) == rows[0].var_corrected
    assert parsed[1]["corrected_pass"] in ("True", "False")
