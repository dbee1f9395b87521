/* C interface for the audited lambda calculus library. */

#ifndef CAU_H
#define CAU_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque handle to a term. */
typedef struct CauTerm CauTerm;

/* Status codes. */
#define CAU_OK 0
#define CAU_ERR_PARSE 1
#define CAU_ERR_FUEL 2
#define CAU_ERR_STUCK 3
#define CAU_ERR_BAD_ARGUMENT 4

/* Message describing the most recent failure on the calling thread, or NULL.
 * Owned by the library; valid until the next failing call on the thread. */
const char *cau_last_error(void);

/* Parse surface syntax into a term handle. */
int32_t cau_parse(const char *text, CauTerm **out);

/* Render a term in surface syntax. Free with cau_string_free. */
char *cau_print(const CauTerm *t);

/* Normalize under "tau", "sigma", or "sigmatau". */
int32_t cau_normalize(const CauTerm *t, const char *rules, CauTerm **out);

/* Reduce with engine "naive", "sigma", or "machine". A max_steps of zero
 * selects the engine's default budget. */
int32_t cau_reduce(const CauTerm *t, const char *engine, uint64_t max_steps,
                   CauTerm **out);

void cau_term_free(CauTerm *t);
void cau_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* CAU_H */
