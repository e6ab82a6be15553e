"""Buildings from Moufang foundations: blueprints, chamber systems and the left-multiplication action."""
