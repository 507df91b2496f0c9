"""Exact truncated formal series"""
