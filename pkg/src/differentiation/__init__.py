"""Discrete differentiation: pair-groupoid nerves and staged jets"""
