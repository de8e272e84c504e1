"""APS toolkit: abstractive proposition segmentation metrics, formats and data pipelines"""

__version__ = '1.0.0'
__license__ = 'MIT'
__description__ = 'Proposition segmentation evaluation and dataset tooling'
