"""faceveil: make face identity unextractable by recognizers yet perceptible to humans."""

__version__ = "0.1.0"
