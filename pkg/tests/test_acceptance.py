"""Full verification suite, one test per check.

Runs the same registry as the ``reproduce`` command once per session and
prints a PASS/FAIL line for every check. The ``efficiency-3-2-strictly-below``
check is known to fail: the exact Haar-averaged detection probability of the
three-port splitter on qubit internals equals the subspace bound 1/2 (see the
basis-enumeration oracle in test_multiport), so no run can certify a strict
gap; the assertion is kept as the honest record of that fact.
"""

import pytest

from statecomp import reproduce

CHECK_IDS = reproduce.check_ids()


@pytest.fixture(scope="session")
def verification_results():
    return {result.check_id: result for result in reproduce.run_all(reproduce.DEFAULT_SEED)}


@pytest.mark.parametrize("check_id", CHECK_IDS)
def test_acceptance(verification_results, check_id):
    result = verification_results[check_id]
    print(result.line())
    assert result.passed, result.line()
