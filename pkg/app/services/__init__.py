# Services: one class of static methods per module, plus a singleton instance
