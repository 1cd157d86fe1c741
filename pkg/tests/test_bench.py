from qisorank.bench import cycle_with_chord, format_csv, run_bench, separable_gap


def test_family_is_connected_and_not_bipartite():
    for n in range(3, 17):
        g = cycle_with_chord(n)
        assert g.is_connected and not g.is_bipartite()


def test_separable_gap_small():
    assert separable_gap(6) <= 1e-8
    assert separable_gap(4, m=3) <= 1e-8


def test_rows_and_csv():
    rows = run_bench((4, 5), repetitions=1, t=4)
    assert [r.joint_dim for r in rows] == [16, 25]
    assert [r.factor_dim_sum for r in rows] == [8, 10]
    assert format_csv(rows).count("\n") == 3
