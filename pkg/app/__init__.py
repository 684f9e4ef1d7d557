"""Exact p-adic engine for syntomic cohomology of k[x]/x^e"""
