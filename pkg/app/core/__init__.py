# core package initialization