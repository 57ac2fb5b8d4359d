#!/usr/bin/env python3
from fastapi import FastAPI, HTTPException
from pydantic import Field
from uuid import uuid4
from datetime import datetime
import json
import os
import threading
import psutil

from mincnot.circuit_ir import emit_circuit_text
from mincnot.config import DEFAULT_MC_SAMPLES, DEFAULT_SEED, MC_MIN_SAMPLES, MatrixFile
from mincnot.core_linalg import require_unitary
from mincnot.ep import ep_exact, ep_monte_carlo
from mincnot.errors import ConvergenceFailure, SynthesisError, VerificationFailure
from mincnot.kak import kak_decompose, makhlin_invariants, zyz_decompose
from mincnot.synth import synth_u4

# ----------------- Config -----------------
REQUESTS_LOG_PATH = "synth.requests.log"
MATRIX_TOL = 1e-9
results_by_id = {}
CPU_COUNT = psutil.cpu_count() or 1

# ----------------- Instância da API -----------------
app = FastAPI(title="Minimal-CNOT Synthesis API")

# ----------------- Schemas -----------------
class SynthRequest(MatrixFile):
    expand_swap: bool = True
    simplify: bool = True
    seed: int = DEFAULT_SEED

class KakRequest(MatrixFile):
    seed: int = DEFAULT_SEED

class EpRequest(MatrixFile):
    mc: bool = False
    mc_samples: int = Field(default=DEFAULT_MC_SAMPLES, ge=MC_MIN_SAMPLES)
    seed: int = DEFAULT_SEED

# ----------------- Helpers -----------------
def append_requests_log(obj):
    try:
        with open(REQUESTS_LOG_PATH, "a", encoding="utf-8") as f:
            f.write(json.dumps(obj, ensure_ascii=False, indent=2) + ",\n")
    except Exception as e:
        print("❌ Falha ao gravar requests.log:", e)

def sample_server_cpu(stop_event, samples):
    process = psutil.Process(os.getpid())
    process.cpu_percent(interval=None)
    while not stop_event.is_set():
        try:
            samples.append(process.cpu_percent(interval=0.1))
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            break

def measure_resources(start_time, peak_cpu=0.0, avg_cpu=0.0):
    process = psutil.Process(os.getpid())
    mem_info = process.memory_info()
    elapsed = (datetime.now() - start_time).total_seconds()
    return {
        "timings": {"total": f"{elapsed:.3f} s"},
        "memory": {"server_rss_MB": round(mem_info.rss / 1024 / 1024, 2)},
        "cpu_percent": {
            "peak": round(peak_cpu / CPU_COUNT, 2),
            "avg":  round(avg_cpu  / CPU_COUNT, 2),
        },
    }

def run_measured(fn):
    """Runs fn() while sampling this process's CPU; returns (result, cpu peak, cpu avg)."""
    cpu_samples = []
    stop_event  = threading.Event()
    cpu_thread  = threading.Thread(target=sample_server_cpu, args=(stop_event, cpu_samples), daemon=True)
    cpu_thread.start()
    try:
        result = fn()
    finally:
        stop_event.set()
        cpu_thread.join(timeout=1)
    peak_cpu = max(cpu_samples) if cpu_samples else 0.0
    avg_cpu  = sum(cpu_samples) / len(cpu_samples) if cpu_samples else 0.0
    return result, peak_cpu, avg_cpu

def handle_request(kind, body, compute):
    """Shared flow of every POST endpoint: compute, store, log, map errors to HTTP codes."""
    start_time = datetime.now()
    exec_id = str(uuid4())
    request_data = body.model_dump()
    print(f"📥 Recebido /{kind}: {exec_id}")

    try:
        result, peak_cpu, avg_cpu = run_measured(compute)
    except (VerificationFailure, ConvergenceFailure) as e:
        status, detail = 500, "Erro interno ao processar a solicitação."
        error = e
    except SynthesisError as e:
        status, detail = 422, str(e)
        error = e
    except Exception as e:
        status, detail = 500, "Erro interno ao processar a solicitação."
        error = e
    else:
        results_by_id[exec_id] = result
        append_requests_log({
            "id": exec_id,
            "kind": kind,
            "datetime": start_time.isoformat(),
            "request": request_data,
            "response": result,
            **measure_resources(start_time, peak_cpu, avg_cpu),
        })
        print(f"✅ /{kind} concluído: {exec_id}")
        return {"exec_id": exec_id, "result": result}

    append_requests_log({
        "id": exec_id,
        "kind": kind,
        "datetime": datetime.now().isoformat(),
        "error": str(error),
        "request": request_data,
    })
    print(f"❌ Erro ao processar /{kind}:", error)
    raise HTTPException(status_code=status, detail=detail)

# ----------------- Endpoints -----------------
@app.post("/synth")
def synth(body: SynthRequest):
    def compute():
        u = require_unitary(body.to_array(), 4, MATRIX_TOL)
        report = synth_u4(u, expand_swap=body.expand_swap, simplify_output=body.simplify, seed=body.seed)
        return {
            "circuit": emit_circuit_text(report.circuit),
            "cnot_class": report.cnot_class,
            "path": report.path.value,
            "counts": {
                "cnot": report.counts.cnot,
                "one_qubit": report.counts.one_qubit,
                "swap": report.counts.swap,
            },
            "residual": report.residual,
        }
    return handle_request("synth", body, compute)

@app.post("/kak")
def kak(body: KakRequest):
    def compute():
        u = require_unitary(body.to_array(), 4, MATRIX_TOL)
        dec = kak_decompose(u, body.seed)
        g1, g2 = makhlin_invariants(u)
        locals_ = {}
        for name, a in (("a1", dec.a1), ("a2", dec.a2), ("a3", dec.a3), ("a4", dec.a4)):
            z = zyz_decompose(a)
            locals_[name] = {"phase": z.phase, "alpha": z.alpha, "theta": z.theta, "beta": z.beta}
        return {
            "alpha": dec.alpha,
            "beta": dec.beta,
            "gamma": dec.gamma,
            "phase": dec.phase,
            "locals": locals_,
            "invariants": {"g1_re": g1.real, "g1_im": g1.imag, "g2": g2},
        }
    return handle_request("kak", body, compute)

@app.post("/ep")
def ep(body: EpRequest):
    def compute():
        u = require_unitary(body.to_array(), 4, MATRIX_TOL)
        result = {"ep": ep_exact(u)}
        if body.mc:
            mean, std_error = ep_monte_carlo(u, body.mc_samples, body.seed)
            result.update({"mc_mean": mean, "mc_std_error": std_error, "mc_samples": body.mc_samples})
        return result
    return handle_request("ep", body, compute)

# ----------------- Endpoint auxiliar -----------------
@app.get("/result/{exec_id}")
async def get_result(exec_id: str):
    result = results_by_id.get(exec_id)
    if not result:
        raise HTTPException(status_code=404, detail="Result not found")
    return result

# ----------------- Test endpoint -----------------
@app.get("/test")
async def test():
    return {"status": "API is running. Use POST /synth, /kak or /ep with a matrix."}

# ----------------- Inicialização -----------------
if __name__ == "__main__":
    import uvicorn
    uvicorn.run("server:app", host="0.0.0.0", port=3000, reload=True)
