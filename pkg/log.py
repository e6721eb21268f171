"""
Console logging. Messages go to stderr as ``[elapsed] [source] message``.
"""
import logging
import os
import sys
import time

_start = time.monotonic()
_logger = logging.getLogger('levymax')


class _ElapsedFormatter(logging.Formatter):
    def format(self, record):
        return "[{:.3f}] [{}] {}".format(
            record.created - _start_wall, getattr(record, 'src', 'log'),
            record.getMessage()
        )


_start_wall = time.time() - (time.monotonic() - _start)

if not _logger.handlers:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(_ElapsedFormatter())
    _logger.addHandler(_handler)
    _logger.propagate = False
    _logger.setLevel(os.environ.get('LEVYMAX_LOG_LEVEL', 'INFO').upper())


def log(src, msg, level=logging.INFO):
    try:
        _logger.log(level, str(msg), extra={'src': str(src)})
    except:  # noqa: E722
        print("[log] Caught exception when logging: {} {}".format(
            str(sys.exc_info()[0]), str(sys.exc_info()[1])
        ), file=sys.stderr)


def debug(src, msg):
    log(src, msg, logging.DEBUG)


def log_exception(src, locstr):
    # i.e. caught {ValueError} {in my_method}: {could not cast X to Y}
    log(src, "Caught {} {}: {}".format(
        str(sys.exc_info()[0]), locstr, str(sys.exc_info()[1])
    ), logging.ERROR)
