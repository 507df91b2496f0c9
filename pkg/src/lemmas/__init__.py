"""Finite-difference checks of the Miwa-derivative identities"""
