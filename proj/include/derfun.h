#ifndef DERFUN_H
#define DERFUN_H

#if defined(__GNUC__)
#define DERFUN_API __attribute__((visibility("default")))
#else
#define DERFUN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct derfun_ctx derfun_ctx;
typedef struct derfun_result derfun_result;

typedef enum {
    DERFUN_OK = 0,
    DERFUN_E_INPUT = 1,       /* malformed or out-of-range request */
    DERFUN_E_STRUCTURAL = 2,  /* an internal consistency check failed */
    DERFUN_E_BUDGET = 3,      /* refused: predicted sizes exceed the caps */
    DERFUN_E_INTERNAL = 4,
    DERFUN_E_ARG = 5          /* null handle or pointer */
} derfun_status;

DERFUN_API derfun_ctx* derfun_ctx_new(void);
DERFUN_API void derfun_ctx_free(derfun_ctx* ctx);

/* Caps for the brute-force engine. Defaults 50000 and 10000000. */
DERFUN_API derfun_status derfun_set_budget(derfun_ctx* ctx, unsigned long long max_rank, unsigned long long max_nonzeros);
/* 0 uses the hardware concurrency. Results do not depend on this. */
DERFUN_API derfun_status derfun_set_threads(derfun_ctx* ctx, unsigned threads);
/* Message of the last failing call on ctx, "" if none. Owned by ctx. */
DERFUN_API const char* derfun_last_error(const derfun_ctx* ctx);

/* L_*F^d(Z^r, n) for family "gamma", "lambda" or "sym".
   engine: "integer", "mod-p", "closed-form" or "both".
   degree < 0 returns every degree. prime is used by mod-p only.
   On a budget refusal the result still holds the error object. */
DERFUN_API derfun_status derfun_derive(derfun_ctx* ctx, const char* family, int d, int n, int rank, const char* engine,
                            int degree, unsigned prime, derfun_result** out);

/* CSV with header "n,i,group,engine". which: "appendix-b" or "appendix-c".
   Negative bounds select the full table range. */
DERFUN_API derfun_status derfun_table(derfun_ctx* ctx, const char* which, int rank, int n_lo, int n_hi, int i_lo, int i_hi,
                           derfun_result** out);

/* JSON report. d and max_rank feed the conjecture and brute-cross suites. */
DERFUN_API derfun_status derfun_verify(derfun_ctx* ctx, const char* suite, int d, int max_rank, derfun_result** out);

/* Stable homology H^st_i(Z^r) for i <= i_max <= 40 with per-word provenance. */
DERFUN_API derfun_status derfun_stable(derfun_ctx* ctx, int rank, int i_max, derfun_result** out);

/* Rendered result; owned by the result. text is CSV for tables, JSON otherwise. */
DERFUN_API const char* derfun_result_text(const derfun_result* res);
/* 1 if the result carries no failure (all checks passed, no refusal). */
DERFUN_API int derfun_result_passed(const derfun_result* res);
DERFUN_API void derfun_result_free(derfun_result* res);

#ifdef __cplusplus
}
#endif

#endif
