import logging

import fibered_reps


def test_module_info():
    info = fibered_reps.get_module_info()
    assert info['version'] == fibered_reps.__version__
    assert "genus2" in info['bundled_examples']


def test_setup_logging_adds_one_handler():
    logger = logging.getLogger("fibered_reps")
    before = list(logger.handlers)
    try:
        fibered_reps.setup_logging("warning")
        fibered_reps.setup_logging(logging.DEBUG)
        streams = [h for h in logger.handlers if isinstance(h, logging.StreamHandler)]
        assert len(streams) == 1
        assert logger.level == logging.DEBUG
    finally:
        logger.handlers = before
        logger.setLevel(logging.NOTSET)
