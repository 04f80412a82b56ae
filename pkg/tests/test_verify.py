from fieldcarpet import verify


def test_all_checks_pass_at_default_bounds():
    results = verify.run_all()
    assert [r.name for r in results] == list(verify.CHECKS)
    failed = {r.name: r.counterexample for r in results if not r.passed}
    assert failed == {}
    assert all(r.cases > 0 for r in results)


def test_bounds_narrow_the_run():
    small = verify.run_check("zero_bounds", verify.Bounds(pmax_large=11))
    large = verify.run_check("zero_bounds")
    assert small.passed and small.cases < large.cases
