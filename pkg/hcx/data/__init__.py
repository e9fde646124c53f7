"""Golden data shipped with the package"""
