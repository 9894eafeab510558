"""Colored simplicial sets, bibundle classification and cographs"""
