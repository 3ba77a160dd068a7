from dataclasses import replace

import pytest

from wbansim.config import SimConfig
from wbansim.engine import RoundMetrics, RunSummary, run_simulation
from wbansim.io import (CSV_HEADER, compare_runs, emit_plot_series,
                        read_metrics_csv, read_summary_json, render_comparison,
                        write_metrics_csv, write_summary_json)


def row(r, alive=19, sent=2, received=2, loss=36.5):
    return RoundMetrics(round=r, alive_count=alive, packets_sent=sent,
                        packets_received_at_sink=received, critical_received=1,
                        total_residual=9.5 - 0.001 * r, mean_residual=(9.5 - 0.001 * r) / 19,
                        mean_path_loss=loss, equilibrium_ok=True)


def summary(protocol, seed, stability, lifetime, tp=100.0, residual_pct=80.0):
    return RunSummary(protocol=protocol, seed=seed, stability_period=stability,
                      network_lifetime=lifetime, throughput_pct=tp,
                      final_total_residual=residual_pct * 9.5 / 100,
                      residual_pct_at_end=residual_pct,
                      packets_sent_total=1000, packets_received_total=990)


class TestMetricsCsv:
    def test_three_rounds_four_lines(self, tmp_path):
        path = tmp_path / "m.csv"
        write_metrics_csv([row(r) for r in range(3)], path)
        lines = path.read_text().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 5  # header + 3 rows + trailing newline
        assert lines[-1] == ""

    def test_round_trip(self, tmp_path):
        metrics = [row(0), row(1, loss=None), row(2, alive=18)]
        path = tmp_path / "m.csv"
        write_metrics_csv(metrics, path)
        assert read_metrics_csv(path) == metrics

    def test_quiescent_round_serializes_empty_loss_field(self, tmp_path):
        path = tmp_path / "m.csv"
        write_metrics_csv([row(0, sent=0, received=0, loss=None)], path)
        data_line = path.read_text().split("\n")[1]
        fields = data_line.split(",")
        assert fields[7] == ""
        assert "nan" not in data_line.lower()

    def test_lf_line_endings(self, tmp_path):
        path = tmp_path / "m.csv"
        write_metrics_csv([row(0)], path)
        assert b"\r" not in path.read_bytes()

    def test_byte_identical_across_reruns(self, tmp_path):
        cfg = replace(SimConfig(), rounds=300)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_metrics_csv(run_simulation(cfg).metrics, a)
        write_metrics_csv(run_simulation(cfg).metrics, b)
        assert a.read_bytes() == b.read_bytes()

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("not,a,metrics,file\n1,2,3,4\n")
        with pytest.raises(ValueError):
            read_metrics_csv(path)


class TestSummaryJson:
    def test_round_trip(self, tmp_path):
        s = summary("amhrp", 3, 4500, 10000)
        path = tmp_path / "s.json"
        write_summary_json(s, path)
        assert read_summary_json(path) == s

    def test_none_throughput_survives(self, tmp_path):
        s = summary("amhrp", 1, 0, 0, tp=None)
        path = tmp_path / "s.json"
        write_summary_json(s, path)
        assert read_summary_json(path).throughput_pct is None


class TestPlotSeries:
    def make_runs(self, rounds=4):
        runs = {}
        for i, proto in enumerate(("amhrp", "mattempt", "simple")):
            runs[proto] = [row(r, alive=19 - i, loss=None if r == 0 else 40.0 + i)
                           for r in range(rounds)]
        return runs

    def test_four_files_with_expected_shape(self, tmp_path):
        files = emit_plot_series(self.make_runs(rounds=4), tmp_path)
        assert [f.name for f in files] == ["lifetime.dat", "throughput.dat",
                                           "residual.dat", "pathloss.dat"]
        for f in files:
            lines = f.read_text().strip().split("\n")
            assert len(lines) == 5  # header + 4 rounds
            assert lines[0] == "# round amhrp mattempt simple"

    def test_column_order_follows_input_order(self, tmp_path):
        runs = self.make_runs()
        reordered = {k: runs[k] for k in ("simple", "amhrp", "mattempt")}
        files = emit_plot_series(reordered, tmp_path)
        header = files[0].read_text().split("\n")[0]
        assert header == "# round simple amhrp mattempt"

    def test_throughput_column_is_cumulative(self, tmp_path):
        files = emit_plot_series(self.make_runs(rounds=3), tmp_path)
        lines = files[1].read_text().strip().split("\n")[1:]
        amhrp_col = [int(line.split()[1]) for line in lines]
        assert amhrp_col == [2, 4, 6]

    def test_missing_loss_written_as_nan(self, tmp_path):
        files = emit_plot_series(self.make_runs(), tmp_path)
        first_data = files[3].read_text().split("\n")[1]
        assert "nan" in first_data

    def test_alive_column_non_increasing_for_real_run(self, tmp_path):
        res = run_simulation(replace(SimConfig(), rounds=500))
        files = emit_plot_series({"amhrp": res.metrics}, tmp_path)
        alive = [int(line.split()[1])
                 for line in files[0].read_text().strip().split("\n")[1:]]
        assert all(b <= a for a, b in zip(alive, alive[1:]))

    def test_mismatched_round_counts_rejected(self, tmp_path):
        runs = self.make_runs()
        runs["simple"] = runs["simple"][:-1]
        with pytest.raises(ValueError):
            emit_plot_series(runs, tmp_path)


class TestCompareRuns:
    def test_fifty_percent_stability_improvement(self):
        summaries = [summary("amhrp", s, 6000, 10000) for s in (1, 2, 3)]
        summaries += [summary("mattempt", s, 4000, 8000) for s in (1, 2, 3)]
        report = compare_runs(summaries)
        pair = report.pairwise[("amhrp", "mattempt")]
        assert pair["stability_improvement_pct"] == pytest.approx(50.0)

    def test_250_percent_lifetime_improvement(self):
        summaries = [summary("amhrp", 1, 5000, 10000),
                     summary("mattempt", 1, 4000, 2857)]
        report = compare_runs(summaries)
        pair = report.pairwise[("amhrp", "mattempt")]
        assert pair["lifetime_improvement_pct"] == pytest.approx(
            100.0 * (10000 - 2857) / 2857)

    def test_identical_summaries_give_zero_ratios(self):
        summaries = [summary("amhrp", 1, 5000, 9000),
                     summary("simple", 1, 5000, 9000)]
        report = compare_runs(summaries)
        pair = report.pairwise[("amhrp", "simple")]
        assert pair["stability_improvement_pct"] == 0.0
        assert pair["lifetime_improvement_pct"] == 0.0
        assert pair["throughput_delta_pct_points"] == 0.0
        assert pair["residual_delta_pct_points"] == 0.0

    def test_medians_only_over_shared_seeds(self):
        summaries = [summary("amhrp", s, 6000, 10000) for s in (1, 2, 3)]
        summaries += [summary("mattempt", s, 4000, 8000) for s in (2, 3, 4)]
        report = compare_runs(summaries)
        assert report.medians[0].seeds == (2, 3)

    def test_no_shared_seeds_rejected(self):
        summaries = [summary("amhrp", 1, 1, 1), summary("mattempt", 2, 1, 1)]
        with pytest.raises(ValueError):
            compare_runs(summaries)

    def test_single_protocol_rejected(self):
        with pytest.raises(ValueError):
            compare_runs([summary("amhrp", 1, 1, 1)])

    def test_seed_order_permutation_invariant(self):
        fwd = [summary("amhrp", s, 4000 + 100 * s, 9000) for s in (1, 2, 3)]
        fwd += [summary("simple", s, 2000 + 100 * s, 4000) for s in (1, 2, 3)]
        rev = list(reversed(fwd))
        assert compare_runs(fwd) == compare_runs(rev)

    def test_render_mentions_protocols(self):
        summaries = [summary("amhrp", 1, 6000, 10000),
                     summary("mattempt", 1, 4000, 4000)]
        text = render_comparison(compare_runs(summaries))
        assert "amhrp" in text and "mattempt" in text
        assert "+50.0%" in text
