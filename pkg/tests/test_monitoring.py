import pytest

from fibered_reps.monitoring import PipelineMetrics, metrics, monitor_stage, write_metrics


@pytest.fixture(autouse=True)
def enabled_metrics(monkeypatch):
    monkeypatch.setattr(metrics, "enabled", True)


def runs(stage, status):
    return metrics.sample('stage_runs_total', {'stage': stage, 'status': status}) or 0


def test_metrics_is_a_singleton():
    assert PipelineMetrics() is metrics


def test_monitor_stage_counts_success_and_error():
    @monitor_stage("test_stage")
    def work(fail):
        if fail:
            raise ArithmeticError("boom")
        return 42

    before_ok, before_err = runs("test_stage", "success"), runs("test_stage", "error")
    assert work(False) == 42
    with pytest.raises(ArithmeticError):
        work(True)
    assert runs("test_stage", "success") == before_ok + 1
    assert runs("test_stage", "error") == before_err + 1
    assert work.__name__ == "work"


def test_dimension_and_status_gauges():
    metrics.record_dimension("toy", "h1", 4)
    metrics.record_report_status(1)
    assert metrics.sample('last_dimension', {'spec': "toy", 'quantity': "h1"}) == 4
    assert metrics.sample('last_report_status') == 1


def test_write_metrics(tmp_path):
    metrics.record_stage("written", "success", 0.2)
    target = tmp_path / "fibered.prom"
    assert write_metrics(str(target)) is True
    text = target.read_text()
    assert 'fibered_reps_stage_runs_total{stage="written",status="success"}' in text
    assert write_metrics(None) is False
