"""Kan conditions, profiles, fibres and weak acyclicity"""
