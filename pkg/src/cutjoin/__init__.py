"""Cut-and-join operators and evolution"""
