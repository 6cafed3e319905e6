import json

import pytest

from twistlat.errors import InputError
from twistlat.witness import run_witness_pipeline


@pytest.mark.parametrize("chain", [(1, 1, 2, 2), (1, 1, 1, 4), (1, 2, 2, 4), (2, 2, 2, 2), (1, 1, 1, 1, 1, 4)])
@pytest.mark.parametrize("policy", ["exponent", "lcm"])
def test_pipeline_verdicts(chain, policy):
    report = run_witness_pipeline(chain, policy)
    assert report.ok
    for rec in report.factors:
        assert rec.image_matches and rec.isotropic and rec.conformal_symplectic
        if policy == "exponent":
            assert rec.n == rec.kernel.exponent


def test_pipeline_json_stable():
    a = json.dumps(run_witness_pipeline((1, 1, 1, 4)).to_dict(), indent=2)
    b = json.dumps(run_witness_pipeline([1, 1, 1, 4]).to_dict(), indent=2)
    assert a == b


def test_pipeline_rejects_policy():
    with pytest.raises(InputError):
        run_witness_pipeline((1, 1, 2, 2), "max")
