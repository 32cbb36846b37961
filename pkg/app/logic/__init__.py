"""Polynomials in t, formula syntax trees and the textual syntax."""
