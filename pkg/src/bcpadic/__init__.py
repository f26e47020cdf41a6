"""p-adic L-functions of modular forms and their imaginary quadratic base-changes."""

__version__ = "0.1.0"
