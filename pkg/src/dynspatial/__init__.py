"""Dynamic spatial scenes: qualitative abstraction, motion events, grounded
semantics, a small construction grammar and two-agent language games."""

__version__ = "0.1.0"
