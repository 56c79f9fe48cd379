# services package initialization