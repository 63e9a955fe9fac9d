/* Exercises the shared-library C API end to end the way an embedder would:
 * load, validate, run, compare, and the error-code contract. Compiled as
 * plain C to prove the header needs no C++. */

#include <bcsim/bcsim.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int g_failures = 0;

#define CHECK(cond)                                                     \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "CHECK failed at %s:%d: %s\n", __FILE__, __LINE__, \
              #cond);                                                   \
      ++g_failures;                                                     \
    }                                                                   \
  } while (0)

static char* path_of(const char* name) {
  static char buf[512];
  snprintf(buf, sizeof(buf), "%s/%s", BCSIM_FIXTURES_DIR, name);
  return buf;
}

static void test_load_and_validate(void) {
  bcsim_scenario* scn = NULL;
  CHECK(bcsim_scenario_load_file(path_of("basic_sensing.json"), &scn) == BCSIM_OK);
  CHECK(scn != NULL);

  size_t count = 999;
  char* text = NULL;
  CHECK(bcsim_scenario_validate(scn, &count, &text) == BCSIM_OK);
  CHECK(count == 0);
  CHECK(text != NULL && text[0] == '\0');
  bcsim_string_free(text);
  bcsim_scenario_free(scn);

  /* A broken document: violations are data, not a failed call. */
  const char* bad =
      "{\"seed\": 1, \"duration\": -5.0, \"cells\": [], \"nodes\": [],"
      " \"consumers\": []}";
  CHECK(bcsim_scenario_load_string(bad, &scn) == BCSIM_OK);
  CHECK(bcsim_scenario_validate(scn, &count, &text) == BCSIM_OK);
  CHECK(count > 0);
  CHECK(strstr(text, "$.duration") != NULL);
  bcsim_string_free(text);

  /* Running an invalid scenario is a validation error. */
  bcsim_result* result = NULL;
  CHECK(bcsim_run(scn, NULL, &result) == BCSIM_ERR_VALIDATION);
  CHECK(result == NULL);
  CHECK(strlen(bcsim_last_error()) > 0);
  bcsim_scenario_free(scn);

  /* Unparseable text and unreadable files map to distinct codes. */
  CHECK(bcsim_scenario_load_string("not json at all", &scn) == BCSIM_ERR_PARSE);
  CHECK(bcsim_scenario_load_file("/no/such/file.json", &scn) == BCSIM_ERR_IO);
}

static void test_run_is_deterministic(void) {
  bcsim_scenario* scn = NULL;
  CHECK(bcsim_scenario_load_file(path_of("offload_mix.json"), &scn) == BCSIM_OK);

  bcsim_result* a = NULL;
  bcsim_result* b = NULL;
  CHECK(bcsim_run(scn, NULL, &a) == BCSIM_OK);
  CHECK(bcsim_run(scn, NULL, &b) == BCSIM_OK);

  char *trace_a = NULL, *trace_b = NULL, *json_a = NULL, *json_b = NULL;
  CHECK(bcsim_result_trace(a, &trace_a) == BCSIM_OK);
  CHECK(bcsim_result_trace(b, &trace_b) == BCSIM_OK);
  CHECK(bcsim_result_report_json(a, &json_a) == BCSIM_OK);
  CHECK(bcsim_result_report_json(b, &json_b) == BCSIM_OK);
  CHECK(strcmp(trace_a, trace_b) == 0);
  CHECK(strcmp(json_a, json_b) == 0);
  CHECK(strstr(trace_a, "# bcsim-trace v1") == trace_a);
  CHECK(strstr(json_a, "\"schema_version\": 1") != NULL);

  char* csv = NULL;
  CHECK(bcsim_result_report_csv(a, &csv) == BCSIM_OK);
  CHECK(strstr(csv, "id,type,state") == csv);
  bcsim_string_free(csv);

  /* A seed override is honored and reported. */
  bcsim_run_options opts;
  memset(&opts, 0, sizeof(opts));
  opts.has_seed = 1;
  opts.seed = 777;
  bcsim_result* c = NULL;
  CHECK(bcsim_run(scn, &opts, &c) == BCSIM_OK);
  char* json_c = NULL;
  CHECK(bcsim_result_report_json(c, &json_c) == BCSIM_OK);
  CHECK(strstr(json_c, "\"seed\": 777") != NULL);

  bcsim_string_free(json_c);
  bcsim_string_free(trace_a);
  bcsim_string_free(trace_b);
  bcsim_string_free(json_a);
  bcsim_string_free(json_b);
  bcsim_result_free(a);
  bcsim_result_free(b);
  bcsim_result_free(c);
  bcsim_scenario_free(scn);
}

static void test_compare(void) {
  bcsim_scenario* scn = NULL;
  CHECK(bcsim_scenario_load_file(path_of("offload_mix.json"), &scn) == BCSIM_OK);

  const char* policies[2] = {"min_latency", "min_energy"};
  char* table = NULL;
  CHECK(bcsim_compare(scn, policies, 2, NULL, &table) == BCSIM_OK);
  CHECK(strstr(table, "min_latency") != NULL);
  CHECK(strstr(table, "min_energy") != NULL);
  /* Header plus one row per policy. */
  int lines = 0;
  for (const char* p = table; *p; ++p) {
    if (*p == '\n') ++lines;
  }
  CHECK(lines == 3);
  bcsim_string_free(table);

  const char* bogus[1] = {"fastest"};
  CHECK(bcsim_compare(scn, bogus, 1, NULL, &table) == BCSIM_ERR_INVALID_ARGUMENT);
  bcsim_scenario_free(scn);
}

static void test_status_names(void) {
  CHECK(strcmp(bcsim_status_name(BCSIM_OK), "ok") == 0);
  CHECK(strcmp(bcsim_status_name(BCSIM_ERR_VALIDATION), "validation_error") == 0);
  CHECK(strlen(bcsim_version()) > 0);
}

int main(void) {
  test_load_and_validate();
  test_run_is_deterministic();
  test_compare();
  test_status_names();
  if (g_failures > 0) {
    fprintf(stderr, "%d C API checks failed\n", g_failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
