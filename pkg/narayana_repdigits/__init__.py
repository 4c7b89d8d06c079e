""" Narayana numbers as products of three repdigits """

from pkg_resources import DistributionNotFound, get_distribution

try:
    __version__ = get_distribution('narayana-repdigits').version
except DistributionNotFound:
    # package is not installed
    __version__ = "unknown"
