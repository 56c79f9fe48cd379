# models package initialization