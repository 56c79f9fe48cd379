# api package initialization