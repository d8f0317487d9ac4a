"""
Алгебраїчне ядро: кругові поля, решітки та тори, скінченні групи
"""
