"""Symbolic toolkit for labelled-space C*-algebras at desk scale."""
