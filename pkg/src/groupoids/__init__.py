"""Finite groupoids, functors, bibundles and crossed modules"""
