"""监控模块初始化"""

from src.monitoring.metrics import ApsMetrics, get_metrics, reset_metrics

__all__ = ['ApsMetrics', 'get_metrics', 'reset_metrics']
