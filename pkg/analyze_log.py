#!/usr/bin/env python3
"""
analyze_log.py
==============
Lê o synth.requests.log e calcula médias de tempo de resposta, resíduo,
contagem de CNOTs, CPU e memória.
"""

import json
import sys
import os
from collections import Counter

LOG_PATH = "synth.requests.log"

def load_log(path):
    """Lê o arquivo .log que é uma sequência de JSONs separados por vírgula"""
    with open(path, "r", encoding="utf-8") as f:
        content = f.read().strip()

    # Remove vírgula final se houver e envolve em array
    if content.endswith(","):
        content = content[:-1]
    content = f"[{content}]"

    return json.loads(content)

def avg(lst):
    return round(sum(lst) / len(lst), 3) if lst else None

def mn(lst):
    return min(lst) if lst else None

def mx(lst):
    return max(lst) if lst else None

def summarize(records):
    """Agrega os registros em um dicionário; usado por analyze() e pelos testes."""
    times       = []
    residuals   = []
    cnots       = []
    cpu_peaks   = []
    server_mems = []
    kinds       = Counter()
    errors      = 0

    for r in records:
        kinds[r.get("kind", "?")] += 1
        if "error" in r:
            errors += 1
            continue

        try:
            times.append(float(r["timings"]["total"].replace(" s", "")))
        except Exception:
            pass

        response = r.get("response") or {}
        if "residual" in response:
            residuals.append(float(response["residual"]))
        if "counts" in response:
            cnots.append(int(response["counts"]["cnot"]))

        try:
            cpu_peaks.append(float(r["cpu_percent"]["peak"]))
        except Exception:
            pass

        try:
            server_mems.append(float(r["memory"]["server_rss_MB"]))
        except Exception:
            pass

    return {
        "total": len(records),
        "errors": errors,
        "kinds": dict(kinds),
        "time": {"avg": avg(times), "min": mn(times), "max": mx(times)},
        "residual": {"avg": sum(residuals) / len(residuals) if residuals else None,
                     "max": mx(residuals)},
        "cnot": {"avg": avg(cnots), "min": mn(cnots), "max": mx(cnots),
                 "histogram": dict(sorted(Counter(cnots).items()))},
        "cpu_peak": {"avg": avg(cpu_peaks), "max": mx(cpu_peaks)},
        "server_rss_MB": {"avg": avg(server_mems), "max": mx(server_mems)},
    }

def analyze(records):
    s = summarize(records)

    print(f"\n{'='*50}")
    print(f"  📊 Análise do synth.requests.log")
    print(f"{'='*50}")
    print(f"  Total de requisições: {s['total']}")
    print(f"  Erros:                {s['errors']}")
    print(f"  Requisições válidas:  {s['total'] - s['errors']}")
    print(f"  Por endpoint:         {s['kinds']}")

    print(f"\n  ⏱️  Tempo de resposta (s):")
    print(f"     Média:  {s['time']['avg']}")
    print(f"     Mínimo: {s['time']['min']}")
    print(f"     Máximo: {s['time']['max']}")

    print(f"\n  🎯  Resíduo (distância até o alvo):")
    print(f"     Média:  {s['residual']['avg']}")
    print(f"     Máximo: {s['residual']['max']}")

    print(f"\n  🔗  CNOTs por circuito:")
    print(f"     Média:      {s['cnot']['avg']}")
    print(f"     Mín / Máx:  {s['cnot']['min']} / {s['cnot']['max']}")
    print(f"     Histograma: {s['cnot']['histogram']}")

    print(f"\n  🖥️  CPU do servidor (%):")
    print(f"     Pico médio: {s['cpu_peak']['avg']}")
    print(f"     Pico máx:   {s['cpu_peak']['max']}")

    print(f"\n  💾  Memória RAM:")
    print(f"     Servidor média: {s['server_rss_MB']['avg']} MB")
    print(f"     Servidor máx:   {s['server_rss_MB']['max']} MB")

    print(f"\n{'='*50}\n")

if __name__ == "__main__":
    path = sys.argv[1] if len(sys.argv) > 1 else LOG_PATH

    if not os.path.exists(path):
        print(f"❌ Arquivo não encontrado: {path}")
        sys.exit(1)

    print(f"📂 Lendo: {path}")
    records = load_log(path)
    analyze(records)
