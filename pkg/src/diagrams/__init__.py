"""Partial chord diagrams, boundary tracing and enumeration"""
