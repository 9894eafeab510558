"""Finite simplicial sets, shapes, maps and constructions"""
