// pipeline placeholder
