"""Kan profile heatmaps"""
