# Geometry module for planes over rings and synthetic planes
