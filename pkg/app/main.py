import logging
import time

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from starlette.middleware.base import BaseHTTPMiddleware

from app.config.settings import get_settings
from app.models.topology import available_devices

settings = get_settings()

logging.basicConfig(
    level=settings.log_level.upper(),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger("app")


# 모든 HTTP 요청 로깅 미들웨어
class RequestLoggingMiddleware(BaseHTTPMiddleware):
    async def dispatch(self, request: Request, call_next):
        method = request.method
        path = request.url.path
        client = request.client.host if request.client else "unknown"

        logger.info(f"📨 HTTP 요청 수신: {client} {method} {path}")
        start_time = time.time()

        try:
            response = await call_next(request)
            elapsed = time.time() - start_time
            logger.info(f"   상태: {response.status_code} ({elapsed:.2f}초)")
            return response
        except Exception as e:
            elapsed = time.time() - start_time
            logger.error(f"   ❌ 오류: {str(e)[:100]} ({elapsed:.2f}초)")
            raise


# FastAPI 앱 생성
app = FastAPI(
    title="Resynth API",
    description="연결성 제약을 고려한 위상 다항식 회로 재합성 API",
    version="1.0.0"
)

# 요청 로깅 미들웨어 추가 (CORS 전에)
app.add_middleware(RequestLoggingMiddleware)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.on_event("startup")
async def startup_event():
    """번들 토폴로지 확인"""
    logger.info("🚀 Resynth API 서버 시작...")
    devices = available_devices()
    if devices:
        logger.info(f"✅ 번들 토폴로지: {', '.join(devices)}")
    else:
        logger.warning(f"⚠️ 토폴로지 데이터 없음: {settings.data_dir}")


# 헬스체크 엔드포인트
@app.get("/health")
async def health_check():
    """헬스체크 엔드포인트"""
    devices = available_devices()
    return {
        "status": "healthy" if devices else "degraded",
        "topologies": len(devices),
    }


# 메인 엔드포인트
@app.get("/")
async def root():
    """API 루트 엔드포인트"""
    return {
        "message": "Resynth API Server",
        "version": "1.0.0",
        "docs": "/docs",
        "health": "/health"
    }

# API 라우트
from app.api import synth
app.include_router(synth.router)

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        app,
        host=settings.api_host,
        port=settings.api_port,
    )
