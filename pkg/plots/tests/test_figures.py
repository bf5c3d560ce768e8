import numpy as np
import pytest

from safebo_plots import PlotJob, SchemaError, plot_regret, plot_samples

RUN_HEADER = ("t,s,x0,f_true,g_true,violation,r,r_prime,r_X,"
              "R,R_prime,R_X,n_surviving_x,n_G,n_M,ms")


def write_run(path, rows):
    """rows: list of (t, s, x, r, r_prime, r_X) tuples; cumulative columns
    are derived so the file is schema-consistent."""
    lines = [RUN_HEADER]
    R = Rp = Rx = 0.0
    for t, s, x, r, rp, rx in rows:
        R += r
        Rp += rp
        Rx += rx
        lines.append(
            f"{t},{s},{x},0.5,0.1,0,{r},{rp},{rx},{R},{Rp},{Rx},10,4,6,1.0"
        )
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def write_oracle(path, xs, boundaries, opts):
    lines = ["x_index,x0,s_boundary,s_opt,f_opt"]
    for j, (x, b, o) in enumerate(zip(xs, boundaries, opts)):
        lines.append(f"{j},{x},{b},{o},0.9")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def constant_regret_rows(n, r=1.0):
    return [(t, 0.0, 0.5, r, r, r) for t in range(1, n + 1)]


def test_single_seed_single_curve(tmp_path):
    run = write_run(tmp_path / "a.csv", constant_regret_rows(20))
    out = tmp_path / "fig.png"
    fig = plot_regret(PlotJob(inputs={"alg": [run]}, metric="R", out=str(out)))
    assert out.exists() and out.stat().st_size > 0
    ax = fig.axes[0]
    labeled = [l for l in ax.lines if not l.get_label().startswith("_")]
    assert [l.get_label() for l in labeled] == ["alg"]
    assert not ax.containers  # no error bars for a single seed


def test_constant_regret_gives_flat_unit_line(tmp_path):
    run = write_run(tmp_path / "a.csv", constant_regret_rows(30))
    fig = plot_regret(PlotJob(inputs={"alg": [run]}, metric="R", out=str(tmp_path / "f.png")))
    line = [l for l in fig.axes[0].lines if l.get_label() == "alg"][0]
    assert np.allclose(line.get_ydata(), 1.0, atol=1e-12)


def test_three_algorithms_three_labeled_curves(tmp_path):
    inputs = {}
    for i, name in enumerate(("one", "two", "three")):
        paths = []
        for seed in range(2):
            rows = constant_regret_rows(15, r=float(i + 1 + 0.1 * seed))
            paths.append(write_run(tmp_path / f"{name}_{seed}.csv", rows))
        inputs[name] = paths
    fig = plot_regret(PlotJob(inputs=inputs, metric="R_prime", out=str(tmp_path / "f.png")))
    ax = fig.axes[0]
    legend_labels = [t.get_text() for t in ax.get_legend().get_texts()]
    assert legend_labels == ["one", "two", "three"]
    assert len(ax.containers) == 3  # error bars present with two seeds


def test_metric_normalization_content(tmp_path):
    # golden content check: R_X / t recomputed independently from the rows
    rows = [(t, 0.0, 0.5, 0.0, 0.0, 1.0 / t) for t in range(1, 11)]
    run = write_run(tmp_path / "a.csv", rows)
    fig = plot_regret(PlotJob(inputs={"alg": [run]}, metric="R_X", out=str(tmp_path / "f.png")))
    line = [l for l in fig.axes[0].lines if l.get_label() == "alg"][0]
    t = np.arange(1, 11, dtype=float)
    expected = np.cumsum(1.0 / t) / t
    assert np.allclose(line.get_ydata(), expected, atol=1e-12)


def test_schema_mismatch_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,s,x0,f_true\n1,0,0,0.5\n")
    with pytest.raises(SchemaError):
        plot_regret(PlotJob(inputs={"alg": [str(bad)]}, out=str(tmp_path / "f.png")))


def test_unknown_metric_rejected(tmp_path):
    run = write_run(tmp_path / "a.csv", constant_regret_rows(5))
    with pytest.raises(SchemaError):
        plot_regret(PlotJob(inputs={"alg": [run]}, metric="Q", out=str(tmp_path / "f.png")))


def test_samples_content(tmp_path):
    xs = np.round(np.linspace(0, 1, 6), 6)
    oracle = write_oracle(tmp_path / "o.csv", xs, np.linspace(0.2, 0.8, 6), [0.1] * 6)
    rows = [
        (1, 0.0, 0.2), (2, 0.1, 0.2), (3, 0.3, 0.2),
        (4, 0.0, 0.6), (5, 0.5, 0.6),
    ]
    run = write_run(tmp_path / "r.csv", [(t, s, x, 0.1, 0.1, 0.1) for t, s, x in rows])
    out = tmp_path / "fig.png"
    fig = plot_samples(PlotJob(inputs={"run": [run]}, out=str(out), oracle=oracle))
    assert out.exists() and out.stat().st_size > 0
    ax = fig.axes[0]
    assert len(ax.collections) == 1
    assert ax.collections[0].get_offsets().shape == (5, 2)
    labels = {l.get_label(): l for l in ax.lines}
    assert "true safe boundary" in labels and "discovered boundary" in labels
    disc = labels["discovered boundary"]
    # golden content: max sampled s per sampled column
    assert np.allclose(disc.get_xdata(), [0.2, 0.6])
    assert np.allclose(disc.get_ydata(), [0.3, 0.5])


def test_samples_empty_run_draws_boundary_only(tmp_path):
    xs = [0.0, 0.5, 1.0]
    oracle = write_oracle(tmp_path / "o.csv", xs, [0.3, 0.4, 0.5], [0.1] * 3)
    run = write_run(tmp_path / "r.csv", [])
    fig = plot_samples(PlotJob(inputs={"run": [run]}, out=str(tmp_path / "f.png"), oracle=oracle))
    ax = fig.axes[0]
    assert len(ax.collections) == 0
    assert [l.get_label() for l in ax.lines] == ["true safe boundary"]


def test_samples_requires_oracle(tmp_path):
    run = write_run(tmp_path / "r.csv", constant_regret_rows(3))
    with pytest.raises(SchemaError):
        plot_samples(PlotJob(inputs={"run": [run]}, out=str(tmp_path / "f.png")))


def test_samples_grid_mismatch_rejected(tmp_path):
    oracle = write_oracle(tmp_path / "o.csv", [0.0, 0.5, 1.0], [0.3, 0.4, 0.5], [0.1] * 3)
    run = write_run(tmp_path / "r.csv", [(1, 0.0, 0.31415, 0.1, 0.1, 0.1)])
    with pytest.raises(SchemaError):
        plot_samples(PlotJob(inputs={"run": [run]}, out=str(tmp_path / "f.png"), oracle=oracle))


def test_rerun_is_idempotent(tmp_path):
    run = write_run(tmp_path / "a.csv", constant_regret_rows(10))
    out = tmp_path / "fig.png"
    plot_regret(PlotJob(inputs={"alg": [run]}, metric="R", out=str(out)))
    first = out.read_bytes()
    plot_regret(PlotJob(inputs={"alg": [run]}, metric="R", out=str(out)))
    assert out.read_bytes() == first
