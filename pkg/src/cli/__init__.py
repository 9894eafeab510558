"""Command-line front end, interchange documents and corpus generators"""
