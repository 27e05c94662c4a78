"""Dispersion spectra of periodic layered thermoelastic media."""
