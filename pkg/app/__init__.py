"""ppres - quantifier bounding for parametric Presburger arithmetic."""
