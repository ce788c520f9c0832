"""Order-4 n-ary quasigroups: semilinearity, reducibility, edge colorings."""

__version__ = "0.1.0"
