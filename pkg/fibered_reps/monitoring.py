"""
Метрики Prometheus для стадий вычислительного конвейера
"""

import logging
import threading
import time
from functools import wraps
from typing import Optional

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

logger = logging.getLogger(__name__)


class PipelineMetrics:
    """Метрики конвейера; один экземпляр на процесс"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls, *args, **kwargs):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self, namespace: str = "fibered_reps"):
        if not hasattr(self, 'initialized'):
            self.namespace = namespace
            self.enabled = True
            self.registry = CollectorRegistry()
            self.metrics = {}
            self._initialize_metrics()
            self.initialized = True

    def _initialize_metrics(self):
        """Инициализация метрик"""

        self.metrics['stage_runs_total'] = Counter(
            f'{self.namespace}_stage_runs_total',
            'Total number of pipeline stage runs',
            ['stage', 'status'],
            registry=self.registry,
        )

        self.metrics['stage_duration_seconds'] = Histogram(
            f'{self.namespace}_stage_duration_seconds',
            'Pipeline stage duration in seconds',
            ['stage'],
            buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0, 300.0],
            registry=self.registry,
        )

        self.metrics['last_dimension'] = Gauge(
            f'{self.namespace}_last_dimension',
            'Last computed cohomology dimension',
            ['spec', 'quantity'],
            registry=self.registry,
        )

        self.metrics['last_report_status'] = Gauge(
            f'{self.namespace}_last_report_status',
            'Exit status of the last full report (0 = hypotheses hold and dims match)',
            registry=self.registry,
        )

    def record_stage(self, stage: str, status: str, duration: float):
        if not self.enabled:
            return
        self.metrics['stage_runs_total'].labels(stage=stage, status=status).inc()
        self.metrics['stage_duration_seconds'].labels(stage=stage).observe(duration)

    def record_dimension(self, spec: str, quantity: str, value: int):
        if not self.enabled:
            return
        self.metrics['last_dimension'].labels(spec=spec, quantity=quantity).set(value)

    def record_report_status(self, code: int):
        if not self.enabled:
            return
        self.metrics['last_report_status'].set(code)

    def sample(self, name: str, labels: Optional[dict] = None) -> Optional[float]:
        """Текущее значение метрики из собственного реестра"""
        return self.registry.get_sample_value(f'{self.namespace}_{name}', labels or {})

    def write(self, path: str) -> bool:
        if not self.enabled:
            return False
        try:
            write_to_textfile(path, self.registry)
            logger.info(f"Metrics written to {path}")
            return True
        except OSError as e:
            logger.error(f"Failed to write metrics to {path}: {e}")
            return False


# Глобальный экземпляр метрик
metrics = PipelineMetrics()


def write_metrics(path: Optional[str]) -> bool:
    if not path:
        return False
    return metrics.write(path)


def monitor_stage(stage: str):
    """Декоратор: время стадии и её исход"""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            try:
                result = func(*args, **kwargs)
                metrics.record_stage(stage, "success", time.time() - start_time)
                return result
            except Exception:
                metrics.record_stage(stage, "error", time.time() - start_time)
                raise
        return wrapper

    return decorator
