# Service Package
