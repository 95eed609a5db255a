use std::ffi::CStr;

use pyo3::prelude::*;
use pyo3::types::PyDict;

/// Runs `code` with the module bound to `cs`; assertion failures surface as
/// Python exceptions.
fn run_python(code: &CStr) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(channel_space_py::channel_space_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("cs", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed: {e}");
        }
    });
}

#[test]
fn rankings_and_distances() {
    run_python(
        c"
from fractions import Fraction
r = cs.Ranking([3, 1, 2])
assert r.perm == [3, 1, 2]
assert r.ranks == [2, 3, 1]
assert r.inverse().perm == [2, 3, 1]
assert len(r) == 3
assert cs.s_pair([1, 2, 3], [3, 2, 1]) == 3
assert cs.oracle_s_pair(cs.Ranking.identity(3), cs.Ranking.reversal(3)) == 3
assert cs.decoding_distance([1, 2, 3], [3, 2, 1]) == Fraction(4, 7)
assert cs.decoding_distance([1, 2], [2, 1]) == Fraction(1, 3)
assert cs.agreement_probability([1, 2], [1, 2]) == 1
assert cs.kendall_tau([1, 2, 3], [3, 2, 1]) == 3
assert cs.transposition_delta([1, 2, 3], 1) == -2
big = cs.s_pair(cs.Ranking.identity(80), cs.Ranking.identity(80))
assert big == 2 ** 80 - 1
assert cs.Ranking([2, 1]) == cs.Ranking.transposition(2, 1)
assert len({cs.Ranking([1, 2]), cs.Ranking([1, 2])}) == 1
try:
    cs.Ranking([1, 1])
except cs.ChannelSpaceError:
    pass
else:
    raise AssertionError('duplicate entries accepted')
",
    );
}

#[test]
fn channels_and_reports() {
    run_python(
        c"
from fractions import Fraction
p = cs.Channel([['5/8', '1/8', '2/8'], ['2/8', '5/8', '1/8'], [0.125, 0.25, Fraction(5, 8)]])
q = cs.Channel.from_json('{\"n\": 3, \"m\": 3, \"entries\": [[\"3/5\", \"3/10\", \"1/10\"], [\"3/10\", \"1/2\", \"1/5\"], [\"1/10\", \"2/5\", \"1/2\"]]}')
assert (p.n, p.m) == (3, 3)
assert p.entries()[2][0] == Fraction(1, 8)
assert p.weak_order_matrix() == [[1, 3, 2], [2, 1, 3], [3, 2, 1]]
assert p.is_stable()
report = cs.radial_agreement(p, q)
assert report['per_column_s'] == [7, 7, 6]
assert report['distance'] == Fraction(1, 21)
assert report['convention'] == cs.CONVENTION
assert cs.oracle_radial_probability(p, q) == Fraction(20, 21)
assert cs.radial_decoding_distance(p, q, prior=['1/2', '1/4', '1/4']) == Fraction(5, 112)
assert cs.global_decoding_distance(p, q) == Fraction(1, 7)
assert cs.decoding_equivalent(p, p)
assert not cs.decoding_equivalent(p, q)
assert cs.oracle_same_decoders(p, q) is False
assert cs.Channel.from_csv(p.to_csv()) == p
assert cs.Channel.from_json(p.to_json()) == p
try:
    cs.Channel([[0.5, 0.4]])
except cs.ChannelSpaceError as e:
    assert 'row 1' in str(e)
else:
    raise AssertionError('row sum not checked')
assert cs.Channel([[0.5, 0.4]], tolerance='1/10').m == 2
assert cs.Channel([[1, 3]], normalize=True).entries() == [[Fraction(1, 4), Fraction(3, 4)]]
",
    );
}

#[test]
fn cones_sampling_and_verification() {
    run_python(
        c"
orders = cs.enumerate_weak_orders(3)
assert len(orders) == 13
assert sorted(cs.cone_dimension(w) for w in orders).count(3) == 6
p = cs.Channel([['5/8', '1/8', '2/8'], ['2/8', '5/8', '1/8'], ['1/8', '2/8', '5/8']])
r = cs.Channel([['2/5', '1/10', '1/2'], ['1/2', '2/5', '1/10'], ['1/10', '1/5', '7/10']])
est = cs.monte_carlo_radial(p, r, 50000, 3)
assert abs(est['estimate'] - 19 / 21) <= 4 * est['standard_error']
assert est == cs.monte_carlo_radial(p, r, 50000, 3)
report = cs.verify(['example6', 'cones'], seed=1)
assert report['passed'] and report['seed'] == 1
table = cs.worked_example_table()
assert table['radial'][1]['oracle_distance'] == '2/21'
assert table['radial'][1]['discrepancy'] is True
",
    );
}
