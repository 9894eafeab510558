"""Collapsible extensions: certificate search, replay and colored outer horn filling"""
